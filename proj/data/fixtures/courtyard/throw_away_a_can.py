def execute_command(image):
    image_patch = ImagePatch(image)
    can_patches = image_patch.find('garbage can')
    if len(can_patches) == 0:
        return {'function': 'None', 'error': 'No garbage can found.'}
    can = can_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (can.horizontal_center, can.vertical_center), 'box': [can.left, can.lower, can.right, can.upper]}
