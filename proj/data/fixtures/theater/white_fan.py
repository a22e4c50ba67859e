def execute_command(image):
    image_patch = ImagePatch(image)
    fan_patches = image_patch.find('fan')
    for fan in fan_patches:
        if fan.verify_property('fan', 'white'):
            return {'function': 'navigate_to_object', 'inputs': (fan.horizontal_center, fan.vertical_center), 'box': [fan.left, fan.lower, fan.right, fan.upper]}
    return {'function': 'None', 'error': 'No white fan found.'}
