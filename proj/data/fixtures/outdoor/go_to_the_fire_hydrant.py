def execute_command(image):
    image_patch = ImagePatch(image)
    hydrant_patches = image_patch.find('fire hydrant')
    if len(hydrant_patches) == 0:
        return {'function': 'None', 'error': 'No fire hydrant found.'}
    hydrant = hydrant_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (hydrant.horizontal_center, hydrant.vertical_center), 'box': [hydrant.left, hydrant.lower, hydrant.right, hydrant.upper]}
