def execute_command(image):
    image_patch = ImagePatch(image)
    broom_patches = image_patch.find('broom')
    if len(broom_patches) == 0:
        return {'function': 'None', 'error': 'No broom found.'}
    broom = broom_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (broom.horizontal_center, broom.vertical_center), 'box': [broom.left, broom.lower, broom.right, broom.upper]}
